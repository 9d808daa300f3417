#pragma once

// Quaternionic Schur analysis via slice-regular power series: H arithmetic,
// chi-embedded linear algebra, the *-algebra of truncated series,
// S-resolvents, state-space realizations, kernel certification and the
// Schur algorithm.

#include "qschur/errors.hpp"
#include "qschur/quaternion.hpp"
#include "qschur/qmatrix.hpp"
#include "qschur/qlinalg.hpp"
#include "qschur/series.hpp"
#include "qschur/s_calculus.hpp"
#include "qschur/realization.hpp"
#include "qschur/linsys.hpp"
#include "qschur/schur.hpp"
#include "qschur/sampling.hpp"
