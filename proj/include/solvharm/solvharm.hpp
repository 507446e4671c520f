#pragma once

#include "solvharm/adapted_basis.hpp"
#include "solvharm/algebra.hpp"
#include "solvharm/algebra_spec.hpp"
#include "solvharm/classifier.hpp"
#include "solvharm/clifford.hpp"
#include "solvharm/curvature.hpp"
#include "solvharm/damek_ricci.hpp"
#include "solvharm/density.hpp"
#include "solvharm/errors.hpp"
#include "solvharm/geodesic.hpp"
#include "solvharm/j_family.hpp"
#include "solvharm/rational.hpp"
#include "solvharm/rk4.hpp"
#include "solvharm/series/coth.hpp"
#include "solvharm/series/lab.hpp"
#include "solvharm/series/ode.hpp"
#include "solvharm/series/poly.hpp"
#include "solvharm/series/truncated.hpp"
#include "solvharm/spectral.hpp"

#define SOLVHARM_VERSION "0.1.0"
