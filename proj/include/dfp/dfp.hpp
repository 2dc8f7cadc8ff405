#pragma once

#include "dfp/codec.hpp"
#include "dfp/error.hpp"
#include "dfp/linalg.hpp"
#include "dfp/metrics.hpp"
#include "dfp/npy.hpp"
#include "dfp/pipeline.hpp"
#include "dfp/ppm.hpp"
#include "dfp/random.hpp"
#include "dfp/tensor.hpp"
#include "dfp/transform.hpp"
