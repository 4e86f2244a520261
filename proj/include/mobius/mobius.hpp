#pragma once

// Umbrella header: number-theoretic sieves, rank-one words, orbit averages,
// and generalized Riesz-product spectra.

#include "mobius/errors.hpp"
#include "mobius/fourier.hpp"
#include "mobius/io.hpp"
#include "mobius/numtheory.hpp"
#include "mobius/orbits.hpp"
#include "mobius/params_io.hpp"
#include "mobius/rational.hpp"
#include "mobius/spectral.hpp"
#include "mobius/words.hpp"
