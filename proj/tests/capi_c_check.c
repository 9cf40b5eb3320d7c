// Copyright 2026 The Wayplan Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* Compiled as C: the public header must stay valid C99. */

#include <stdio.h>
#include <string.h>

#include "wayplan/wayplan.h"

int main(void) {
  wp_context* ctx = NULL;
  char* text = NULL;
  char* request = NULL;
  size_t begin = 0;
  size_t end = 0;
  int rc = 1;
  if (wp_context_new(&ctx) != WP_OK) return 1;
  if (wp_parse_nl(ctx,
                  "Travel dates: January 15th, 2025, DEN to MIA, and January 18th, 2025, "
                  "MIA to DEN.",
                  &request) != WP_OK) {
    goto done;
  }
  if (wp_render_nl(ctx, request, 0, &text) != WP_OK) goto done;
  if (strstr(text, "DEN to MIA") == NULL) goto done;
  {
    char* none = NULL;
    if (wp_parse_nl(ctx, "Travel dates: soon. ", &none) != WP_UNPARSABLE_SEGMENT) goto done;
    if (none != NULL) goto done;
  }
  if (!wp_last_error_span(ctx, &begin, &end) || begin != 14 || end != 18) goto done;
  if (strcmp(wp_status_name(WP_GRID_MISMATCH), "GridMismatch") != 0) goto done;
  rc = 0;
done:
  if (rc != 0) fprintf(stderr, "c api check failed: %s\n", wp_last_error(ctx));
  wp_string_free(text);
  wp_string_free(request);
  wp_context_free(ctx);
  return rc;
}
