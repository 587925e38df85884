// Placeholder main; subcommands are filled in with the experiment drivers.
#include <iostream>

#include "realmono/realmono.hpp"

int main() {
    std::cout << "realmono\n";
    return 0;
}
