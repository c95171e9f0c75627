#include "kinetic/cli.hpp"

int main(int argc, char** argv) { return kinetic::cli::parse_and_dispatch(argc, argv); }
