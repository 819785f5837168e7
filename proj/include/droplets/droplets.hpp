#pragma once

#include "droplets/annulus.hpp"
#include "droplets/curvature.hpp"
#include "droplets/errors.hpp"
#include "droplets/families.hpp"
#include "droplets/geometry.hpp"
#include "droplets/io.hpp"
#include "droplets/numerics.hpp"
#include "droplets/qdiff.hpp"
#include "droplets/trace.hpp"
#include "droplets/verification.hpp"
