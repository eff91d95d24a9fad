#pragma once

#include "dtrap/field_core.hpp"
#include "dtrap/linalg.hpp"
#include "dtrap/presentation.hpp"
#include "dtrap/independence.hpp"
#include "dtrap/constants.hpp"
#include "dtrap/forking.hpp"
#include "dtrap/bernoulli.hpp"
#include "dtrap/scenario.hpp"
#include "dtrap/runner.hpp"
#include "dtrap/builtins.hpp"
