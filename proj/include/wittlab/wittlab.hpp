#pragma once

#include "wittlab/cyclotomic.hpp"
#include "wittlab/precision.hpp"
#include "wittlab/residue.hpp"
#include "wittlab/theta.hpp"
#include "wittlab/tilt.hpp"
#include "wittlab/tilt_witt.hpp"
#include "wittlab/tr_model.hpp"
#include "wittlab/ring_traits.hpp"
#include "wittlab/witt.hpp"
#include "wittlab/witt_poly.hpp"
