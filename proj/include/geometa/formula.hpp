#pragma once

#include "geometa/formula/ast.hpp"
#include "geometa/formula/builtins.hpp"
#include "geometa/formula/eval.hpp"
#include "geometa/formula/parser.hpp"
#include "geometa/formula/printer.hpp"
#include "geometa/formula/rational.hpp"
