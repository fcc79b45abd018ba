#pragma once

#include "posetest/bitset.hpp"
#include "posetest/comparability.hpp"
#include "posetest/config.hpp"
#include "posetest/error.hpp"
#include "posetest/experiment.hpp"
#include "posetest/generators.hpp"
#include "posetest/homomorphism.hpp"
#include "posetest/poset.hpp"
#include "posetest/poset_io.hpp"
#include "posetest/rational.hpp"
#include "posetest/removal.hpp"
#include "posetest/rng.hpp"
#include "posetest/testers.hpp"
