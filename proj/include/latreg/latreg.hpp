#pragma once

#include "corpus.hpp"
#include "duren.hpp"
#include "errors.hpp"
#include "fit.hpp"
#include "io.hpp"
#include "lattice.hpp"
#include "multiplier.hpp"
#include "parallel.hpp"
#include "spectral.hpp"
#include "titchmarsh.hpp"
