#pragma once

#include "big5/errors.hpp"
#include "big5/rational.hpp"
#include "big5/persona.hpp"
#include "big5/prompt.hpp"
#include "big5/gateway.hpp"
#include "big5/scripted.hpp"
#include "big5/http_backend.hpp"
#include "big5/dialogue.hpp"
#include "big5/psychometrics.hpp"
#include "big5/stats.hpp"
#include "big5/scorer.hpp"
#include "big5/eval.hpp"
#include "big5/reports.hpp"
#include "big5/experiment.hpp"
