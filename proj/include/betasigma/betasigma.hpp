#pragma once

// Umbrella header for the betasigma library: a posteriori estimation of the
// Gaussian noise scale in sampled series through polynomial-annihilating
// weighted differences.

#include "betasigma/autoselect.hpp"
#include "betasigma/beta_sample.hpp"
#include "betasigma/coefficients.hpp"
#include "betasigma/dersnr.hpp"
#include "betasigma/errors.hpp"
#include "betasigma/estimators.hpp"
#include "betasigma/io.hpp"
#include "betasigma/rng.hpp"
#include "betasigma/series.hpp"
#include "betasigma/synth.hpp"
