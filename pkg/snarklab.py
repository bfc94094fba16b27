import logging
import sys

from app.main import main

if __name__ == '__main__':
    try:
        sys.exit(main())
    except Exception as e:
        logging.critical(f'程序发生致命错误: {str(e)}', exc_info=True)
        sys.exit(1)
