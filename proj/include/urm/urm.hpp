#pragma once

// Everything in one include.

#include "urm/approx_c4free.hpp"
#include "urm/approx_common.hpp"
#include "urm/approx_subcubic.hpp"
#include "urm/bench.hpp"
#include "urm/coloring.hpp"
#include "urm/enumerate.hpp"
#include "urm/error.hpp"
#include "urm/generators.hpp"
#include "urm/graph.hpp"
#include "urm/io.hpp"
#include "urm/matching.hpp"
#include "urm/oracle.hpp"
