#pragma once

// Convenience umbrella header for the whole library.

#include "id3lab/assignment.hpp"
#include "id3lab/bitvec.hpp"
#include "id3lab/dataset.hpp"
#include "id3lab/distribution.hpp"
#include "id3lab/fourier.hpp"
#include "id3lab/harness.hpp"
#include "id3lab/impurity.hpp"
#include "id3lab/learner.hpp"
#include "id3lab/oracle.hpp"
#include "id3lab/rng.hpp"
#include "id3lab/sampling.hpp"
#include "id3lab/spec_json.hpp"
#include "id3lab/stats.hpp"
#include "id3lab/target.hpp"
#include "id3lab/tree.hpp"
