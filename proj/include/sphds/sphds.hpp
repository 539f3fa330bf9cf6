#ifndef SPHDS_SPHDS_HPP
#define SPHDS_SPHDS_HPP

#include "sphds/coords.hpp"
#include "sphds/csv.hpp"
#include "sphds/dataset.hpp"
#include "sphds/error.hpp"
#include "sphds/healpix.hpp"
#include "sphds/render.hpp"
#include "sphds/stats.hpp"
#include "sphds/window.hpp"

#endif  // SPHDS_SPHDS_HPP
