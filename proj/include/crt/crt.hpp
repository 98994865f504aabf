#pragma once

#include "crt/config.hpp"
#include "crt/core.hpp"
#include "crt/errors.hpp"
#include "crt/fft.hpp"
#include "crt/forward.hpp"
#include "crt/fourier_slice.hpp"
#include "crt/io.hpp"
#include "crt/parallel.hpp"
#include "crt/phantom.hpp"
#include "crt/reconstruct.hpp"
#include "crt/transforms.hpp"
