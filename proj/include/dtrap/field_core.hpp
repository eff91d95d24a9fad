#pragma once

#include "dtrap/error.hpp"
#include "dtrap/expr.hpp"
#include "dtrap/monomial.hpp"
#include "dtrap/pdecomp.hpp"
#include "dtrap/polynomial.hpp"
#include "dtrap/prime_field.hpp"
#include "dtrap/rational.hpp"
#include "dtrap/symbol.hpp"
