#pragma once

#include "zerotf/calibrate.hpp"
#include "zerotf/common.hpp"
#include "zerotf/convergence.hpp"
#include "zerotf/cwt.hpp"
#include "zerotf/fft.hpp"
#include "zerotf/grid.hpp"
#include "zerotf/hyperbolic.hpp"
#include "zerotf/interp.hpp"
#include "zerotf/io.hpp"
#include "zerotf/mask.hpp"
#include "zerotf/pipeline.hpp"
#include "zerotf/quadrature.hpp"
#include "zerotf/signal.hpp"
#include "zerotf/stats.hpp"
#include "zerotf/tables.hpp"
#include "zerotf/wavelet.hpp"
#include "zerotf/zero_index.hpp"
#include "zerotf/zeros.hpp"
