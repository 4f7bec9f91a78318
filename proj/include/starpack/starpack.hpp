#pragma once

#include "starpack/error.hpp"
#include "starpack/generate.hpp"
#include "starpack/graph.hpp"
#include "starpack/kmt.hpp"
#include "starpack/kplus.hpp"
#include "starpack/oracle.hpp"
#include "starpack/packing.hpp"
#include "starpack/rational.hpp"
#include "starpack/seq.hpp"
#include "starpack/trace.hpp"
#include "starpack/experiment.hpp"
