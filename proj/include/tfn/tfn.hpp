#pragma once

#include "tfn/data.hpp"
#include "tfn/embeddings.hpp"
#include "tfn/fusion.hpp"
#include "tfn/gradcheck.hpp"
#include "tfn/gradcheck_suite.hpp"
#include "tfn/inference.hpp"
#include "tfn/layers.hpp"
#include "tfn/metrics.hpp"
#include "tfn/model.hpp"
#include "tfn/ops.hpp"
#include "tfn/optim.hpp"
#include "tfn/report.hpp"
#include "tfn/rng.hpp"
#include "tfn/serialize.hpp"
#include "tfn/tensor.hpp"
#include "tfn/train.hpp"
