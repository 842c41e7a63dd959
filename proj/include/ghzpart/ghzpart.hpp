#pragma once

#include "ghzpart/allocate.hpp"
#include "ghzpart/dynamics.hpp"
#include "ghzpart/noise.hpp"
#include "ghzpart/numeric.hpp"
#include "ghzpart/oracle.hpp"
#include "ghzpart/qfi.hpp"
#include "ghzpart/ramsey.hpp"

namespace ghzpart {

#ifdef GHZPART_VERSION
inline constexpr const char* kVersion = GHZPART_VERSION;
#else
inline constexpr const char* kVersion = "0.0.0";
#endif

}  // namespace ghzpart
