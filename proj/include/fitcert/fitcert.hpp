#pragma once

#include "errors.hpp"
#include "mask.hpp"
#include "certifier.hpp"
#include "geometry.hpp"
#include "synth.hpp"
#include "oracle.hpp"

namespace fitcert {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fitcert
