#include <catch2/catch_amalgamated.hpp>
#include "avd/avd.hpp"
