#pragma once

#include "binconv/arith_fn.hpp"
#include "binconv/checks.hpp"
#include "binconv/convolution.hpp"
#include "binconv/factorization.hpp"
#include "binconv/function_spec.hpp"
#include "binconv/inversion.hpp"
#include "binconv/log_identities.hpp"
#include "binconv/log_linear.hpp"
#include "binconv/multiplicativity.hpp"
#include "binconv/numbers.hpp"
#include "binconv/semimult.hpp"
#include "binconv/series.hpp"
