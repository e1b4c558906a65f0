#pragma once

#include "recipe/acceptability.hpp"
#include "recipe/budget.hpp"
#include "recipe/bundle_io.hpp"
#include "recipe/compare.hpp"
#include "recipe/compose.hpp"
#include "recipe/core.hpp"
#include "recipe/error.hpp"
#include "recipe/ids.hpp"
#include "recipe/rewrite.hpp"
#include "recipe/typekb.hpp"
#include "recipe/typesubst.hpp"
