#pragma once
#include "error.hpp"
#include "expr.hpp"
#include "mb_json.hpp"
#include "mb_model.hpp"
#include "notation.hpp"
#include "quadrature.hpp"
#include "rules.hpp"
#include "series.hpp"
#include "verify.hpp"
