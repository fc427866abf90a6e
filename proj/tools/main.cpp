#include "app.hpp"

int main(int argc, char** argv) { return fracmarkov::app::main_entry(argc, argv); }
