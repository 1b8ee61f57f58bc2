#pragma once

#include "be.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "ingest.hpp"
#include "io.hpp"
#include "kmer.hpp"
#include "labeling.hpp"
#include "metrics.hpp"
#include "minres.hpp"
#include "random.hpp"
#include "significance.hpp"
#include "synth.hpp"
