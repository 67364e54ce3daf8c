#pragma once

// Umbrella header for the sfnlm library: grayscale image denoising with
// NL-means in the spatial domain, in the Fourier domain, and their
// two-stage composition, plus the benchmark harness.

#include "sfnlm/bench.hpp"
#include "sfnlm/image.hpp"
#include "sfnlm/io.hpp"
#include "sfnlm/metrics.hpp"
#include "sfnlm/nlm_frequency.hpp"
#include "sfnlm/nlm_spatial.hpp"
#include "sfnlm/noise.hpp"
#include "sfnlm/parallel.hpp"
#include "sfnlm/patch_weights.hpp"
#include "sfnlm/pipeline.hpp"
#include "sfnlm/spectral.hpp"
