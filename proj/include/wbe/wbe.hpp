// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wbe-watermark Authors

#pragma once

#include "wbe/attacks.hpp"
#include "wbe/audio_io.hpp"
#include "wbe/bits.hpp"
#include "wbe/embedder.hpp"
#include "wbe/entropy.hpp"
#include "wbe/error.hpp"
#include "wbe/evaluate.hpp"
#include "wbe/extractor.hpp"
#include "wbe/key_file.hpp"
#include "wbe/metrics.hpp"
#include "wbe/resample.hpp"
#include "wbe/wavelet.hpp"
