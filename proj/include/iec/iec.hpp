#pragma once

#include "iec/ans_core.hpp"
#include "iec/container.hpp"
#include "iec/digits.hpp"
#include "iec/error.hpp"
#include "iec/interleave.hpp"
#include "iec/lanes.hpp"
#include "iec/mux.hpp"
#include "iec/rans.hpp"
#include "iec/symbol_table.hpp"
