#ifndef FRAMERESTORE_FRAMERESTORE_HPP
#define FRAMERESTORE_FRAMERESTORE_HPP

// Umbrella header. The gan/ and pipeline/ headers pull in libtorch; include
// the core/, degrade/, synth/ and metrics/ headers individually to stay
// torch-free.

#include "framerestore/core/errors.hpp"
#include "framerestore/core/geometry.hpp"
#include "framerestore/core/image.hpp"
#include "framerestore/core/manifest.hpp"
#include "framerestore/core/png_io.hpp"
#include "framerestore/core/rng.hpp"
#include "framerestore/core/split.hpp"
#include "framerestore/degrade/artifacts.hpp"
#include "framerestore/degrade/corpus.hpp"
#include "framerestore/degrade/sampler.hpp"
#include "framerestore/gan/engine.hpp"
#include "framerestore/gan/image_pool.hpp"
#include "framerestore/gan/losses.hpp"
#include "framerestore/gan/networks.hpp"
#include "framerestore/gan/tensor_bridge.hpp"
#include "framerestore/gan/translate.hpp"
#include "framerestore/metrics/average_precision.hpp"
#include "framerestore/metrics/blob_detector.hpp"
#include "framerestore/metrics/matching.hpp"
#include "framerestore/metrics/report.hpp"
#include "framerestore/pipeline/config.hpp"
#include "framerestore/pipeline/figures.hpp"
#include "framerestore/pipeline/stages.hpp"
#include "framerestore/synth/scenes.hpp"

#endif
