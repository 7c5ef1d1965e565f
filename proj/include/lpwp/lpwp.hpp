#pragma once

#include "lpwp/canonical.hpp"
#include "lpwp/cli.hpp"
#include "lpwp/dataset.hpp"
#include "lpwp/direction.hpp"
#include "lpwp/entities.hpp"
#include "lpwp/error.hpp"
#include "lpwp/io.hpp"
#include "lpwp/ir.hpp"
#include "lpwp/lp_model.hpp"
#include "lpwp/lp_reader.hpp"
#include "lpwp/ner_scorer.hpp"
#include "lpwp/numeric.hpp"
#include "lpwp/report.hpp"
#include "lpwp/simplex.hpp"
#include "lpwp/vertex_enumeration.hpp"
