#pragma once

#include "tqft/asymptotics.hpp"
#include "tqft/curve_ops.hpp"
#include "tqft/cut_system.hpp"
#include "tqft/error.hpp"
#include "tqft/io.hpp"
#include "tqft/lie_data.hpp"
#include "tqft/s_matrix.hpp"
#include "tqft/smatrix_cache.hpp"
#include "tqft/toeplitz.hpp"
#include "tqft/verlinde.hpp"
