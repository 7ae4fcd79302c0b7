#pragma once

#include "igsm/core.hpp"
#include "igsm/modarith.hpp"
#include "igsm/semantics.hpp"
#include "igsm/vocabulary.hpp"
#include "igsm/config.hpp"
#include "igsm/graph.hpp"
#include "igsm/render.hpp"
#include "igsm/verify.hpp"
#include "igsm/augment.hpp"
#include "igsm/corpus.hpp"
#include "igsm/harness.hpp"
#include "igsm/records.hpp"
#include "igsm/pipeline.hpp"
