#include "hoskip/cli.hpp"

int main(int argc, char** argv) { return hoskip::cli::run(argc, argv); }
