#pragma once

#include "specp/alignment.hpp"
#include "specp/certificates.hpp"
#include "specp/cli.hpp"
#include "specp/estimators.hpp"
#include "specp/experiments.hpp"
#include "specp/instance.hpp"
#include "specp/loo.hpp"
#include "specp/noise.hpp"
#include "specp/rng.hpp"
#include "specp/serialize.hpp"
#include "specp/spectral.hpp"
#include "specp/types.hpp"
