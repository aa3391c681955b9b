#pragma once

#include "ssframe/config.hpp"
#include "ssframe/rational.hpp"
#include "ssframe/interval.hpp"
#include "ssframe/ifs.hpp"
#include "ssframe/fourier.hpp"
#include "ssframe/tiling.hpp"
#include "ssframe/frame.hpp"
#include "ssframe/verdicts.hpp"
#include "ssframe/gabor.hpp"
#include "ssframe/format.hpp"
#include "ssframe/json_io.hpp"
#include "ssframe/report.hpp"
#include "ssframe/reproduce.hpp"
