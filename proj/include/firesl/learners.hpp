#pragma once

#include "firesl/learners/learner.hpp"
#include "firesl/learners/linear.hpp"
#include "firesl/learners/knn.hpp"
#include "firesl/learners/tree.hpp"
#include "firesl/learners/boosting.hpp"
#include "firesl/learners/forest.hpp"
#include "firesl/learners/mlp.hpp"
