#pragma once

#include "ciplab/corpus.hpp"
#include "ciplab/duality.hpp"
#include "ciplab/extreal.hpp"
#include "ciplab/haar.hpp"
#include "ciplab/io.hpp"
#include "ciplab/minimize.hpp"
#include "ciplab/report.hpp"
#include "ciplab/version.hpp"
