#pragma once

#include "canonical.hpp"
#include "clique_tree.hpp"
#include "combinatorics.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "experiment.hpp"
#include "generators.hpp"
#include "graph.hpp"
#include "laws.hpp"
#include "limits.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "rooted.hpp"
#include "stats.hpp"
#include "subgraph.hpp"
