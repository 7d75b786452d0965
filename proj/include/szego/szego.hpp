#pragma once

// Umbrella header.

#include "szego/cli.hpp"
#include "szego/curve.hpp"
#include "szego/errors.hpp"
#include "szego/field.hpp"
#include "szego/laguerre.hpp"
#include "szego/lambert.hpp"
#include "szego/penner.hpp"
