#pragma once

#include "graphmine/bench.hpp"
#include "graphmine/community.hpp"
#include "graphmine/dense_matrix.hpp"
#include "graphmine/error.hpp"
#include "graphmine/eval.hpp"
#include "graphmine/graph.hpp"
#include "graphmine/graph_embedding.hpp"
#include "graphmine/graph_matrices.hpp"
#include "graphmine/io.hpp"
#include "graphmine/linalg.hpp"
#include "graphmine/node_embedding.hpp"
#include "graphmine/random.hpp"
#include "graphmine/sgns.hpp"
#include "graphmine/sparse_matrix.hpp"
#include "graphmine/walks.hpp"
