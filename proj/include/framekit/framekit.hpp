#pragma once

#include "framekit/duality.hpp"
#include "framekit/frame.hpp"
#include "framekit/fusion.hpp"
#include "framekit/generators.hpp"
#include "framekit/json_io.hpp"
#include "framekit/linalg.hpp"
#include "framekit/local_lift.hpp"
#include "framekit/random.hpp"
#include "framekit/tolerance.hpp"
