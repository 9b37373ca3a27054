#ifndef MAP2FIT_MAP2FIT_HPP
#define MAP2FIT_MAP2FIT_HPP

#include "map2fit/comparison.hpp"
#include "map2fit/divergence.hpp"
#include "map2fit/error.hpp"
#include "map2fit/estimate.hpp"
#include "map2fit/likelihood.hpp"
#include "map2fit/matrix2.hpp"
#include "map2fit/model.hpp"
#include "map2fit/optimizer.hpp"
#include "map2fit/random.hpp"
#include "map2fit/simulate.hpp"

#endif
