// symext.hpp: Umbrella header.

#pragma once

#include "symext/linalg.hpp"
#include "symext/quantum.hpp"
#include "symext/extend.hpp"
#include "symext/constructions.hpp"
#include "symext/boundary.hpp"
#include "symext/param.hpp"
#include "symext/random.hpp"
#include "symext/io.hpp"
#include "symext/acceptance.hpp"
