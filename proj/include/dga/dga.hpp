#pragma once

#include "dga/alphabet.hpp"
#include "dga/automaton.hpp"
#include "dga/base.hpp"
#include "dga/dot.hpp"
#include "dga/family.hpp"
#include "dga/fixtures.hpp"
#include "dga/game.hpp"
#include "dga/graph.hpp"
#include "dga/guard.hpp"
#include "dga/json_io.hpp"
#include "dga/language.hpp"
#include "dga/mso.hpp"
#include "dga/transforms.hpp"
