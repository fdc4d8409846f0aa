// Umbrella header.
#pragma once

#include "saftlab/affine_conv.hpp"
#include "saftlab/fft.hpp"
#include "saftlab/interp.hpp"
#include "saftlab/io.hpp"
#include "saftlab/parallel.hpp"
#include "saftlab/params.hpp"
#include "saftlab/saft.hpp"
#include "saftlab/samra.hpp"
#include "saftlab/sawt.hpp"
#include "saftlab/signal.hpp"
