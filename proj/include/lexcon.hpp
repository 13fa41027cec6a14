#pragma once

#include "lexcon/corpus.hpp"
#include "lexcon/grammar.hpp"
#include "lexcon/parser.hpp"
#include "lexcon/render.hpp"
#include "lexcon/solver.hpp"
#include "lexcon/term.hpp"
