#pragma once

// Convenience header pulling in the whole library.

#include "bayesdec/commands.hpp"
#include "bayesdec/config.hpp"
#include "bayesdec/csv.hpp"
#include "bayesdec/dataset.hpp"
#include "bayesdec/diagnostics.hpp"
#include "bayesdec/draws.hpp"
#include "bayesdec/effects.hpp"
#include "bayesdec/error.hpp"
#include "bayesdec/ingest.hpp"
#include "bayesdec/logit.hpp"
#include "bayesdec/loss.hpp"
#include "bayesdec/plots.hpp"
#include "bayesdec/report.hpp"
#include "bayesdec/rng.hpp"
#include "bayesdec/sampler.hpp"
#include "bayesdec/selftest.hpp"
#include "bayesdec/stats.hpp"
#include "bayesdec/svg.hpp"
#include "bayesdec/version.hpp"
