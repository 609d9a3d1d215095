// Umbrella header.

#pragma once

#include "qecp/complex_matrix.hpp"
#include "qecp/homodyne.hpp"
#include "qecp/io.hpp"
#include "qecp/kerr.hpp"
#include "qecp/known_ecp.hpp"
#include "qecp/monte_carlo.hpp"
#include "qecp/optics.hpp"
#include "qecp/published_tables.hpp"
#include "qecp/protocol.hpp"
#include "qecp/qutrit.hpp"
#include "qecp/rng.hpp"
#include "qecp/state.hpp"
