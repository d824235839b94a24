#pragma once

#include "checked.hpp"
#include "error.hpp"
#include "ffarith.hpp"
#include "surface.hpp"
#include "threefold.hpp"
#include "qseries.hpp"
#include "io.hpp"
#include "fixtures.hpp"
#include "livne.hpp"
