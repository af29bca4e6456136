#pragma once

#include "consfree/analysis.hpp"
#include "consfree/rewrite.hpp"
#include "consfree/tabulation.hpp"
#include "consfree/term.hpp"
#include "consfree/tm_compiler.hpp"
#include "consfree/transforms.hpp"
#include "consfree/trs_format.hpp"
#include "consfree/version.hpp"
