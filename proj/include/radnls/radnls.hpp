#ifndef RADNLS_RADNLS_HPP
#define RADNLS_RADNLS_HPP

#include "radnls/config.hpp"
#include "radnls/dynamics.hpp"
#include "radnls/errors.hpp"
#include "radnls/functionals.hpp"
#include "radnls/grid.hpp"
#include "radnls/io.hpp"
#include "radnls/minimize.hpp"
#include "radnls/potential.hpp"
#include "radnls/profiles.hpp"

#endif  // RADNLS_RADNLS_HPP
