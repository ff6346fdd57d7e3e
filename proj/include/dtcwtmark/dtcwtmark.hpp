#ifndef DTCWTMARK_DTCWTMARK_HPP
#define DTCWTMARK_DTCWTMARK_HPP

#include "attack_spec.hpp"
#include "attacks.hpp"
#include "bench.hpp"
#include "color.hpp"
#include "dtcwt.hpp"
#include "errors.hpp"
#include "metrics.hpp"
#include "plane.hpp"
#include "random.hpp"
#include "svd.hpp"
#include "synth.hpp"
#include "video.hpp"
#include "watermark.hpp"
#include "y4m.hpp"

#endif  // DTCWTMARK_DTCWTMARK_HPP
