#ifndef MOBART_MOBART_HPP
#define MOBART_MOBART_HPP

#include "mobart/atlas.hpp"
#include "mobart/attainment.hpp"
#include "mobart/band_depth.hpp"
#include "mobart/bart.hpp"
#include "mobart/benchmarks.hpp"
#include "mobart/box.hpp"
#include "mobart/error.hpp"
#include "mobart/harness.hpp"
#include "mobart/io.hpp"
#include "mobart/matrix.hpp"
#include "mobart/metrics.hpp"
#include "mobart/pareto.hpp"
#include "mobart/random.hpp"
#include "mobart/tree.hpp"

#endif
