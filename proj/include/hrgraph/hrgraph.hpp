#pragma once

#include "decomposition.hpp"
#include "encoding.hpp"
#include "error.hpp"
#include "grammar.hpp"
#include "graph.hpp"
#include "hr_algebra.hpp"
#include "hr_text.hpp"
#include "io.hpp"
#include "isomorphism.hpp"
#include "labels.hpp"
#include "logic.hpp"
#include "parse_tree.hpp"
#include "recognizer.hpp"
#include "sexpr.hpp"
#include "structure.hpp"
#include "transduction.hpp"
#include "tree.hpp"
