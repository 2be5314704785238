#pragma once

#include "ssg/counter.hpp"
#include "ssg/gadgets.hpp"
#include "ssg/game.hpp"
#include "ssg/game_io.hpp"
#include "ssg/numeric.hpp"
#include "ssg/oracle.hpp"
#include "ssg/random_game.hpp"
#include "ssg/solver.hpp"
#include "ssg/verify.hpp"
#include "ssg/version.hpp"
