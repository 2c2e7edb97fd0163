#ifndef FIXTURE_GUARDED_H
#define FIXTURE_GUARDED_H

void blink_init(void);
extern volatile int tick_count;

#endif
