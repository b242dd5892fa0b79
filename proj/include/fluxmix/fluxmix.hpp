#pragma once

#include "fluxmix/circuit.hpp"
#include "fluxmix/config.hpp"
#include "fluxmix/errors.hpp"
#include "fluxmix/figures.hpp"
#include "fluxmix/lindblad.hpp"
#include "fluxmix/response.hpp"
#include "fluxmix/search.hpp"
#include "fluxmix/spectral.hpp"
#include "fluxmix/svg_plot.hpp"
#include "fluxmix/sweep.hpp"
#include "fluxmix/table_io.hpp"
