volatile int flag = 0;

int GPIO_Handler() {
  flag = 1;
  gpio_put(LED, 1);
}

void main(void) {
  int status;
  int cnt = 0;
  while (1) {
    if (flag == 1) {
      cnt++;
      status = cnt;
    }
  }
}
