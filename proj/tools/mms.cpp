#include "mms/cli.hpp"

int main(int argc, char** argv) { return mms::cli::dispatch(argc, argv); }
