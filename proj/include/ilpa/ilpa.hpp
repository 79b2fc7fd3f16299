#pragma once

#include "ilpa/graph.hpp"
#include "ilpa/similarity.hpp"
#include "ilpa/lpa.hpp"
#include "ilpa/metrics.hpp"
#include "ilpa/bench_gen.hpp"
#include "ilpa/harness.hpp"
