#pragma once

#include "mgconv/periodic_fn.hpp"
#include "mgconv/grid.hpp"
#include "mgconv/kernel.hpp"
#include "mgconv/convolve.hpp"
#include "mgconv/multilevel.hpp"
#include "mgconv/bounds.hpp"
#include "mgconv/experiments.hpp"
