#pragma once

#include "urfg/clustering.hpp"
#include "urfg/dataset.hpp"
#include "urfg/feature_graph.hpp"
#include "urfg/forest.hpp"
#include "urfg/graph_mining.hpp"
#include "urfg/matrix.hpp"
#include "urfg/pipeline.hpp"
#include "urfg/serialize.hpp"
#include "urfg/stats.hpp"
#include "urfg/synthetic.hpp"
