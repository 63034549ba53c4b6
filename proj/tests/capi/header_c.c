/* The public header must compile as C and the library must link from C. */
#include <stdio.h>
#include <string.h>

#include "wpk/wpk.h"

int main(void) {
  char* listing = NULL;
  wpk_run* run = NULL;
  wpk_check_info info;
  int ok;

  if (strcmp(wpk_version(), "0.1.0") != 0) return 1;
  if (wpk_list_models(WPK_FORMAT_TEXT, &listing) != WPK_OK) return 1;
  ok = strstr(listing, "tower") != NULL;
  wpk_string_free(listing);
  if (!ok) return 1;

  if (wpk_verify("{\"model\": \"euclidean_kahler\", \"samples\": 10}", &run) != WPK_OK) {
    fprintf(stderr, "%s\n", wpk_last_error());
    return 1;
  }
  ok = wpk_run_passed(run) && wpk_run_check(run, 0, &info) == WPK_OK && info.pass;
  wpk_run_free(run);
  return ok ? 0 : 1;
}
