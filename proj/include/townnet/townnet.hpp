#pragma once

#include "townnet/experiment.hpp"
#include "townnet/generator.hpp"
#include "townnet/graph.hpp"
#include "townnet/io.hpp"
#include "townnet/layers.hpp"
#include "townnet/metrics.hpp"
#include "townnet/params.hpp"
#include "townnet/sampling.hpp"
#include "townnet/sir.hpp"
