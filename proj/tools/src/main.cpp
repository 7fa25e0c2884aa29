#include <iostream>

#include "polaron_hhg_app/app.hpp"

int main(int argc, char** argv) { return polaron::app::main(argc, argv, std::cout, std::cerr); }
