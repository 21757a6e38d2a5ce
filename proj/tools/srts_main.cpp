#include "srts/scenario_io.hpp"

int main(int argc, char** argv) { return srts::cli_main(argc, argv); }
