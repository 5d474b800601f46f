#ifndef SUMMER_SUMMER_HPP
#define SUMMER_SUMMER_HPP

#include "summer/config.hpp"
#include "summer/dictionaries.hpp"
#include "summer/errors.hpp"
#include "summer/eval.hpp"
#include "summer/io.hpp"
#include "summer/recovery.hpp"
#include "summer/rng.hpp"
#include "summer/scene.hpp"
#include "summer/synthesis.hpp"
#include "summer/version.hpp"
#include "summer/xampling.hpp"

#endif
