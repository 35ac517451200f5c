#pragma once

#include "papal/checker.hpp"
#include "papal/errors.hpp"
#include "papal/evaluator.hpp"
#include "papal/fixtures.hpp"
#include "papal/formula.hpp"
#include "papal/generators.hpp"
#include "papal/model.hpp"
#include "papal/model_io.hpp"
#include "papal/parser.hpp"
#include "papal/qbf.hpp"
#include "papal/relations.hpp"
#include "papal/state_set.hpp"
#include "papal/synthesis.hpp"
#include "papal/validity.hpp"
