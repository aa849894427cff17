#pragma once

#include "petriform/ctmc.hpp"
#include "petriform/errors.hpp"
#include "petriform/io.hpp"
#include "petriform/matrix.hpp"
#include "petriform/net.hpp"
#include "petriform/product_form.hpp"
#include "petriform/rational.hpp"
#include "petriform/reach.hpp"
#include "petriform/reductions.hpp"
#include "petriform/structure.hpp"
#include "petriform/traffic.hpp"
