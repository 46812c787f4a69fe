#include "senti/cli.hpp"

int main(int argc, char** argv) { return senti::parse_and_run(argc, argv); }
