#ifndef HILOK_HILOK_HPP
#define HILOK_HILOK_HPP

#include "hilok/error.hpp"
#include "hilok/gf.hpp"
#include "hilok/series.hpp"
#include "hilok/tower.hpp"
#include "hilok/parse.hpp"
#include "hilok/witt.hpp"
#include "hilok/forms.hpp"
#include "hilok/kmilnor.hpp"
#include "hilok/hcoh.hpp"
#include "hilok/linalg.hpp"
#include "hilok/recip.hpp"
#include "hilok/ext.hpp"

#endif
