#pragma once

// Umbrella header.

#include "indivec/dataset.hpp"
#include "indivec/embedding.hpp"
#include "indivec/error.hpp"
#include "indivec/eval.hpp"
#include "indivec/forge.hpp"
#include "indivec/harness.hpp"
#include "indivec/indicator.hpp"
#include "indivec/labels.hpp"
#include "indivec/predictor.hpp"
#include "indivec/provider.hpp"
#include "indivec/store.hpp"
#include "indivec/taxonomy.hpp"
