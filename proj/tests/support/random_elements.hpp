#pragma once

#include "dtrap/fuzz.hpp"

namespace dtrap::testing {
using namespace dtrap::fuzz;
}
