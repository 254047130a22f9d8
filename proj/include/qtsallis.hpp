#pragma once

#include "qtsallis/classical_info.hpp"
#include "qtsallis/density_matrix.hpp"
#include "qtsallis/distributions.hpp"
#include "qtsallis/entropic_index.hpp"
#include "qtsallis/errors.hpp"
#include "qtsallis/log_sum_exp.hpp"
#include "qtsallis/oracle_verify.hpp"
#include "qtsallis/quantum_state.hpp"
#include "qtsallis/separability_solver.hpp"
#include "qtsallis/spectrum.hpp"
#include "qtsallis/werner_family.hpp"
