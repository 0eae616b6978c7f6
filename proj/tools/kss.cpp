#include "kss/cli.hpp"

int main(int argc, char** argv) { return kss::cli_dispatch(argc, argv); }
