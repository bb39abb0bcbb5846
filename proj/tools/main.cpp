#include "bohm1d/cli.hpp"

int main(int argc, char** argv) {
    return bohm1d::cli::run_cli(argc, argv);
}
