#pragma once

#include "kss/catalog.hpp"
#include "kss/construct.hpp"
#include "kss/design.hpp"
#include "kss/design_io.hpp"
#include "kss/search.hpp"
#include "kss/theorems.hpp"
