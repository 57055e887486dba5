#pragma once

#include "dbel/formula.hpp"
#include "dbel/parser.hpp"
#include "dbel/print.hpp"
#include "dbel/transform.hpp"
#include "dbel/model.hpp"
#include "dbel/model_io.hpp"
#include "dbel/semantics.hpp"
#include "dbel/random.hpp"
#include "dbel/props.hpp"
#include "dbel/sat.hpp"
#include "dbel/muddy.hpp"
#include "dbel/dot.hpp"
