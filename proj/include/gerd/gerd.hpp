#pragma once

#include "gerd/config.hpp"
#include "gerd/core.hpp"
#include "gerd/eventgen.hpp"
#include "gerd/geometry.hpp"
#include "gerd/io.hpp"
#include "gerd/noise.hpp"
#include "gerd/pipeline.hpp"
#include "gerd/render.hpp"
#include "gerd/rng.hpp"
#include "gerd/transforms.hpp"
