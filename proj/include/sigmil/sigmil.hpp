#pragma once

// Core library: everything except file I/O (sigmil/io.hpp, needs OpenCV) and
// configuration serialization (sigmil/config.hpp, needs nlohmann/json).

#include "sigmil/errors.hpp"
#include "sigmil/evaluation.hpp"
#include "sigmil/features.hpp"
#include "sigmil/imaging.hpp"
#include "sigmil/mil_core.hpp"
#include "sigmil/rng.hpp"
#include "sigmil/sampling.hpp"
#include "sigmil/sig_boost.hpp"
#include "sigmil/significance.hpp"
#include "sigmil/synth.hpp"
#include "sigmil/tracker.hpp"
#include "sigmil/version.hpp"
#include "sigmil/weak_learners.hpp"
