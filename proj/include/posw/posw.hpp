#pragma once

#include "posw/corpus.hpp"
#include "posw/error.hpp"
#include "posw/eval.hpp"
#include "posw/experiment.hpp"
#include "posw/index.hpp"
#include "posw/integrate.hpp"
#include "posw/models.hpp"
#include "posw/posstats.hpp"
#include "posw/tagger.hpp"
#include "posw/text.hpp"
#include "posw/weights.hpp"
