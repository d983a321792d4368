#pragma once

#include "percobound/certify.hpp"
#include "percobound/error.hpp"
#include "percobound/generators.hpp"
#include "percobound/graph.hpp"
#include "percobound/graph_io.hpp"
#include "percobound/harness.hpp"
#include "percobound/matrix.hpp"
#include "percobound/oracle.hpp"
#include "percobound/parallel.hpp"
#include "percobound/percolation.hpp"
#include "percobound/philox.hpp"
#include "percobound/report_json.hpp"
#include "percobound/spectral.hpp"
#include "percobound/theory.hpp"
#include "percobound/version.hpp"
